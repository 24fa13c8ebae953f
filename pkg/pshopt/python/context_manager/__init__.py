from .delayedinterrupt import DelayedInterrupt
