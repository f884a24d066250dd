var hooks = new Map();
loadHooks(hooks);
app.get("/hook", (req, res) => {
  var count = 0;
  count = count + 1;
  log("hook", count);
  var hook = hooks.get(req.params.hook);
  if (hook && typeof hook === 'function') {
    hook(req.params, count);
  }
  res.end();
});
