var table = {};
table.ping = function (x) {
  return x;
};
app.post("/seven", (req, res) => {
  log("seven");
  trace("seven");
  var msg = req.body;
  var op = msg.op;
  let fn = table[op];
  if (table.hasOwnProperty(op)) {
    fn(req);
  }
});
