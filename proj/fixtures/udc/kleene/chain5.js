var table = {};
table.ping = function (x) {
  return x;
};
app.post("/five", (req, res) => {
  log("five");
  var op = req.op;
  let fn = table[op];
  if (table.hasOwnProperty(op)) {
    fn(req);
  }
});
