var table = {};
table.ping = function (x) {
  return x;
};
app.post("/three", (req, res) => {
  var fn = table[req.cmd];
  if (table.hasOwnProperty(req.cmd)) {
    fn(req);
  }
});
