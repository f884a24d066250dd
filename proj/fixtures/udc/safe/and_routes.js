var table = new Map();
var onMessage = function (event) {
  var data = JSON.parse(event.data);
  var count = 0;
  count = count + 1;
  var route = table.get(data.route);
  typeof route === 'function' && route(data, count);
};
