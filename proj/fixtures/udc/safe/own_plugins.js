var plugins = {};
plugins.hello = function (args) {
  return args;
};
var audit = [];
app.get("/plugin", (req, res) => {
  var started = Date.now();
  var plugin = plugins[req.query.plugin];
  audit.push(started);
  trace("plugin", started);
  if (plugins.hasOwnProperty(req.query.plugin)) {
    plugin(req.query);
  }
  res.end();
});
