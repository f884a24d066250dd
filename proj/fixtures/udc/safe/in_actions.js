var actions = {};
actions.list = function (query) {
  return query;
};
app.get("/action", (req, res) => {
  var started = Date.now();
  var count = 0;
  count = count + 1;
  var name = req.query.action;
  log(started, count);
  if (name in actions) {
    actions[name](req.query);
  }
  res.end();
});
