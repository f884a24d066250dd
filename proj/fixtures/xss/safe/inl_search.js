app.get("/find", (req, res) => {
  var query = req.query.q;
  var html = "<p>" + query + "</p>";
  metrics.count("find");
  res.send(escape(html));
});
