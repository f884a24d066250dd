var jobs = {};
jobs["resize"] = function (job) {
  job.done = true;
};
var onMessage = function (event) {
  var msg = event.data;
  var kind = msg.kind;
  let job = jobs[kind];
  if (jobs.hasOwnProperty(kind)) {
    job(msg);
  }
};
