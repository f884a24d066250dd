const greet = function (req, res) {
  res.setHeader("Content-Type", "text/html");
  var who = req.who;
  who = encodeURIComponent(who);
  var message = "Hello " + who;
  res.send(message);
};
