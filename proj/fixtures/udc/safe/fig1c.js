var actions = new Map();
loadActions(actions);
app.get("/run", (req, res) => {
  var action = actions.get(req.action);
  (typeof action === 'function') && action(req.inp);
});
