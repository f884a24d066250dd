var cmds = {};
cmds.stop = function (args) {
  log(args);
};
app.post("/cmds", (req, res) => {
  var cmd = req.body.cmd;
  metrics.count("cmds");
  if (cmd in cmds) {
    cmds[cmd](req.body.args);
  }
  res.end();
});
