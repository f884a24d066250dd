app.get("/profile", (req, res) => {
  var name = req.query.name;
  name = escape(name);
  var page = "<h1>" + name + "</h1>";
  res.send(page);
});
