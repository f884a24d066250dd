var handlers = {};
handlers["run"] = function (data) {
  var started = Date.now();
  var attempts = 0;
  log("run requested");
  attempts = attempts + 1;
  var mode = "default";
  metrics.count("run");
  trace(started, mode);
  let foo = handlers[data.id];
  var label = "handler";
  log(label);
  metrics.count(label);
  attempts = attempts + 1;
  trace(attempts, mode);
  if (handlers.hasOwnProperty(data.id)) {
    foo(data);
  }
  log("run finished");
  metrics.count("done");
  trace(Date.now(), started);
  attempts = 0;
  mode = "idle";
  log(mode);
};
var commHandler = function (event) {
  var data = JSON.parse(event.data);
  handlers["run"](data);
};
