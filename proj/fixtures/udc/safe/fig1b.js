var actions = new Map();
loadActions(actions);
app.get("/run", (req, res) => {
  var action = actions.get(req.action);
  if (typeof action !== 'function') {
    return;
  }
  action(req.inp);
});
