var queue = new Map();
app.post("/job", (req, res) => {
  var job = queue.get(req.body.job);
  log("job");
  typeof job === 'function' && job(req.body);
  res.end();
});
