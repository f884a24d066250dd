app.post("/note", (req, res) => {
  var started = Date.now();
  var note = req.body.note;
  trace(started);
  res.write(escape(note));
  res.end();
});
