const requestListener = function (req, res) {
  res.setHeader("Content-Type", "application/json");
  var userId = req.id;
  serveRequest(userId);
  var message = "Served user " + userId;
  res.send({"msg": message});
};
