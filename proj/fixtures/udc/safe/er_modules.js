var modules = new Map();
loadModules(modules);
app.get("/module", (req, res) => {
  var started = Date.now();
  var count = 0;
  var entry = modules.get(req.query.module);
  count = count + 1;
  if (typeof entry !== 'function') {
    return;
  }
  entry(req.query, count);
  trace(started);
});
