const labelHandler = function (req, res) {
  res.setHeader("Content-Type", "text/plain");
  var label = req.params.label;
  res.write(encodeURIComponent(label));
};
