var ops = new Map();
setup(ops);
app.get("/op", (req, res) => {
  var started = Date.now();
  trace("op", started);
  var op = ops.get(req.query.op);
  log("op");
  typeof op === 'function' && op(req.query);
  res.end();
});
