var registry = {};
registry["load"] = function (msg) {
  log(msg);
};
var onMessage = function (event) {
  var msg = JSON.parse(event.data);
  var op = msg.op;
  log("op");
  trace(op);
  if (op in registry) {
    registry[op](msg);
  }
};
