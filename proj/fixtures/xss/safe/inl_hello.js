app.get("/hello", (req, res) => {
  var name = req.query.name;
  res.send(escape(name));
});
