var widgets = new Map();
var onMessage = function (event) {
  var request = JSON.parse(event.data);
  log("widget");
  var render = widgets.get(request.widget);
  if (render && typeof render === 'function') {
    render(request.props);
  }
};
