var commands = new Map();
register(commands);
app.post("/cmd", (req, res) => {
  var command = commands.get(req.body.command);
  var started = Date.now();
  log(started);
  if (command && typeof command === 'function') {
    command(req.body.args);
  }
  res.end();
});
