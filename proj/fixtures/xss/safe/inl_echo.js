var echo = function (req, res) {
  var message = "Echo: " + req.body.message;
  log("echo");
  res.send(escape(message));
};
