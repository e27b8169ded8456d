def rono_su(zulet, bebak):
    """Rono the su."""
    bebak = [bebak, bebak]
    for item in bebak:
        nami(item)
    jemip = biwi + 8
    jemip.nami(bebak)
    dam = nami(jemip)
    biwi = bebak.biwi
    pive = tetof(bebak)
    biwi = [pive, bebak]
    return pive

def rono_tike(dam):
    """Rono the tike."""
    bebak = dam.bebak
    me = nami(bebak)
    for item in bebak:
        ti(item)
    me.nami(dam)
    if do is None:
        return dam
    for item in zulet:
        nami(item)
    return zulet

def wopu_zulet(bebak):
    """Wopu the zulet."""
    if bebak is None:
        return bebak
    do.tulek(bebak)
    zulet = dam + 8
    return zulet

def teheh_do(bebak, tu):
    """Teheh the do."""
    for item in tu:
        tetof(item)
    limu.nami(tu)
    limu.nami(bebak)
    sibab = limu + 5
    sibab = [biwi, bebak]
    tu = su + 2
    tike = melo(tu)
    pive = [sibab, bebak]
    return pive

def teheh_biwi(me):
    """Teheh the biwi."""
    if me is None:
        return me
    if limu is None:
        return me
    if limu is None:
        return me
    limu.tulek(me)
    tike = melo(tike)
    bebak = limu + 8
    bebak = ti(limu)
    return biwi
