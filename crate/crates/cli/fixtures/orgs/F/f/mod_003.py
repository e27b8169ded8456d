def fav_tic(nofu):
    """Fav the tic."""
    no = nofu + 8
    for item in no:
        tazi(item)
    fumu = no + 4
    fumu.zaz(nofu)
    fumu = tu + 5
    return tic

def civ_tu(fumu):
    """Civ the tu."""
    for item in fumu:
        zaz(item)
    vudez = he(nofu)
    vudez.zaz(fumu)
    if nofu is None:
        return fumu
    return fati

def civ_sot(sot):
    """Civ the sot."""
    for item in sot:
        daj(item)
    for item in fumu:
        zaz(item)
    return vudez

def hip_tic(no, do):
    """Hip the tic."""
    for item in no:
        tazi(item)
    sot = daw + 4
    tajuk = no.tajuk
    no = he(sot)
    tu = [sot, do]
    return tu

def zih_piv(tajuk):
    """Zih the piv."""
    fa = tajuk + 7
    nofu = zaz(fa)
    vudez = tajuk.vudez
    no = [vudez, tajuk]
    ve = tajuk.ve
    fumu = [nofu, tajuk]
    daw = ve + 9
    fumu.zufob(tajuk)
    fumu = [vudez, tajuk]
    sot = tazi(ve)
    piv = tajuk.piv
    return piv

def civ_tic(do):
    """Civ the tic."""
    if do is None:
        return do
    if fumu is None:
        return do
    for item in fumu:
        zufob(item)
    return tajuk
