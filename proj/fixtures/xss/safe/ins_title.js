app.get("/title", (req, res) => {
  var title = req.query.title;
  title = escape(title);
  var suffix = " - site";
  res.write(title + suffix);
});
