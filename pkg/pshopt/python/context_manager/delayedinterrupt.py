import signal
import threading
import logging

logger = logging.getLogger(__name__)


class DelayedInterrupt(object):
    """
    Context manager to delay Ctrl-C (or KeyboardInterrupt, SIGINT)
    until the block is left. Used around cache writes.
    https://gist.github.com/tcwalther/ae058c64d5d9078a9f333913718bba95

    Signal handlers can only be installed from the main thread; elsewhere
    the block runs unprotected.
    """
    def __init__(self, signals=signal.SIGINT):
        if not isinstance(signals, list) and not isinstance(signals, tuple):
            signals = [signals]
        self.sigs = signals

    def __enter__(self):
        self.signal_received = {}
        self.old_handlers = {}
        self.active = threading.current_thread() is threading.main_thread()
        if not self.active:
            return self
        for sig in self.sigs:
            self.signal_received[sig] = False
            self.old_handlers[sig] = signal.getsignal(sig)
            def handler(s, frame, sig=sig):
                self.signal_received[sig] = (s, frame)
                logger.info('Signal %s received. Delaying KeyboardInterrupt.', signal.Signals(sig).name)
            signal.signal(sig, handler)
        return self

    def __exit__(self, type, value, traceback):
        if not self.active:
            return
        for sig in self.sigs:
            signal.signal(sig, self.old_handlers[sig])
            if self.signal_received[sig] and callable(self.old_handlers[sig]):
                self.old_handlers[sig](*self.signal_received[sig])
