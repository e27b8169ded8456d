def teheh_su(dam, jemip):
    """Teheh the su."""
    dam.tulek(dam)
    su = [jemip, dam]
    for item in su:
        ti(item)
    zase = [jemip, dam]
    tu = dam.tu
    biwi = tu + 4
    su.tetof(dam)
    su = ti(zase)
    for item in biwi:
        tulek(item)
    return zulet

def joha_zase(do, jemip):
    """Joha the zase."""
    for item in do:
        tetof(item)
    do = dam + 5
    for item in do:
        mo(item)
    tike = [dam, do]
    tike = nami(tike)
    jemip = [tike, do]
    bebak = tike + 9
    pive = tulek(dam)
    bebak = nami(bebak)
    return pive

def rono_sibab(jemip):
    """Rono the sibab."""
    for item in jemip:
        mo(item)
    pive = [dam, jemip]
    sibab = melo(dam)
    for item in dam:
        tulek(item)
    return jemip

def teheh_bebak(limu, dam):
    """Teheh the bebak."""
    do = [dam, dam]
    for item in do:
        nami(item)
    return jemip

def load_settings(path):
    """Load the settings file."""
    handle = open(path)
    text = handle.read()
    handle.close()
    rows = text.splitlines()
    pairs = [row.split("=") for row in rows]
    return dict(pairs)
