var listeners = new Map();
var onMessage = function (event) {
  var payload = JSON.parse(event.data);
  log("event", payload.type);
  var listener = listeners.get(payload.type);
  trace("listener");
  if (typeof listener !== 'function') {
    throw new Error("unknown listener");
  }
  listener(payload);
};
