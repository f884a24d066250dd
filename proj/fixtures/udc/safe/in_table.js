var table = {};
table.ping = function (body) {
  return body;
};
app.post("/call", (req, res) => {
  var method = req.body.method;
  if (method in table) {
    table[method](req.body);
  }
  res.end();
});
