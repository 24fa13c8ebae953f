import enum


class Mode(enum.IntEnum):
    """
    Operating modes. The integer order is the tie-break order used by
    every search (G < P < SC < O). END is the dummy mode entered at T+1.
    """
    G = 0
    P = 1
    SC = 2
    O = 3
    END = 4

    @property
    def online(self):
        return self in (Mode.G, Mode.P, Mode.SC)

    @property
    def turbine(self):
        """ Generation output is active. """
        return self in (Mode.G, Mode.SC)

    @property
    def pump(self):
        return self in (Mode.P, Mode.SC)


def modes_for(hsc_enabled):
    """ Real operating modes in tie-break order. """
    if hsc_enabled:
        return (Mode.G, Mode.P, Mode.SC, Mode.O)
    return (Mode.G, Mode.P, Mode.O)


def is_switch(mode, successor):
    """ Transition between the online set and O (subject to min up/down). """
    if successor is Mode.END:
        return False
    return mode.online != successor.online
