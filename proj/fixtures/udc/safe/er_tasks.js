var tasks = new Map();
app.post("/task", (req, res) => {
  log("task");
  var task = tasks.get(req.body.task);
  if (typeof task !== 'function') {
    return res.end();
  }
  task(req.body);
  res.end();
});
