progress_callback = None


class SweepContext:
	'''Progress of a sweep over (statement, label, n) cells, dispatched to the active callback.'''

	def __init__(self, total_steps=0):
		self.total_steps = total_steps
		self.progress_callback = progress_callback
		self.progress_stage = None
		self.progress_step = 0
		self.finished = False


	def make_sweep_iter(self, iter, stage=None):
		if not self.progress_callback:
			yield from iter
			return

		for item in iter:
			if stage is not None:
				self.progress_stage = stage

			yield item
			self.progress_step += 1
			self.dispatch_progress()


	def dispatch_progress(self):
		if not self.progress_callback:
			return

		if self.finished or self.total_steps == 0:
			fraction = 1. if self.finished else 0.
		else:
			fraction = min(1., self.progress_step / self.total_steps)

		self.progress_callback(fraction, self.progress_stage)


	def finish(self):
		self.finished = True
		self.dispatch_progress()



class progress_tracking:
	def __init__(self, callback):
		self.callback = callback


	def __enter__(self):
		global progress_callback
		progress_callback = self.callback


	def __exit__(self, type, value, traceback):
		global progress_callback
		progress_callback = None
