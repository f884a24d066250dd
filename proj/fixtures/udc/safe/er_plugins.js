var handlers = new Map();
app.get("/plugin", (req, res) => {
  var started = Date.now();
  var handler = handlers.get(req.query.name);
  trace(started);
  metrics.count("plugin");
  if (typeof handler !== 'function') {
    return res.end();
  }
  handler(req.query);
  res.end();
});
