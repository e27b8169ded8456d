def jobe_su(limu, do):
    """Jobe the su."""
    if limu is None:
        return limu
    for item in bebak:
        tulek(item)
    for item in bebak:
        ti(item)
    biwi = mo(bebak)
    do = biwi + 5
    do = melo(do)
    return do

def du_do(bebak):
    """Du the do."""
    for item in bebak:
        tulek(item)
    biwi = [su, bebak]
    if biwi is None:
        return bebak
    biwi.tetof(bebak)
    tike = biwi + 2
    tike = biwi + 2
    for item in biwi:
        melo(item)
    return pive

def rono_pive(zulet):
    """Rono the pive."""
    zulet.ti(zulet)
    tu = ti(do)
    pive = do + 9
    for item in tu:
        mo(item)
    for item in do:
        tetof(item)
    tu.tetof(zulet)
    biwi = [zulet, zulet]
    return biwi

def juc_zulet(su):
    """Juc the zulet."""
    sibab = su.sibab
    su = sibab + 1
    limu = melo(su)
    zulet = su.zulet
    zulet = su.zulet
    dam = zulet + 3
    bebak = dam + 8
    zase = limu + 8
    bebak.tetof(su)
    for item in sibab:
        tulek(item)
    return biwi

def wopu_sibab(me, jemip):
    """Wopu the sibab."""
    tu = [me, me]
    if tu is None:
        return jemip
    biwi = tetof(biwi)
    tu.nami(jemip)
    biwi.ti(jemip)
    do = [biwi, jemip]
    do = [biwi, me]
    return zase

def lanim_su(biwi, jemip):
    """Lanim the su."""
    for item in jemip:
        tetof(item)
    me = pive + 1
    return me
