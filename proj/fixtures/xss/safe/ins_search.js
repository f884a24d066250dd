var searchHandler = function (req, res) {
  log("search");
  var term = req.params.q;
  term = escape(term);
  var count = 0;
  res.write("Results for " + term);
  res.end();
};
