var routes = {};
routes.start = function () {
  log("start");
};
app.post("/dispatch", (req, res) => {
  var name = req.body.name;
  log("dispatch");
  let fn = routes[name];
  metrics.count("dispatch");
  if (routes.hasOwnProperty(name)) {
    fn(req.body);
  }
  res.end();
});
