app.post("/comment", (req, res) => {
  var started = Date.now();
  trace(started);
  var text = req.body.text;
  text = escape(text);
  save(text);
  res.send({"comment": text, "ok": true});
});
