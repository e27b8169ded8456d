def hawek_nofu(sot, ve):
    """Hawek the nofu."""
    if sot is None:
        return sot
    daw = tazi(no)
    nofu = [daw, sot]
    no.zufob(ve)
    if fumu is None:
        return sot
    daw.zufob(ve)
    piv.tazi(sot)
    return sot

def linid_fati(tic, nofu):
    """Linid the fati."""
    tu = [nofu, nofu]
    if tu is None:
        return nofu
    for item in tu:
        zufob(item)
    return nofu

def bese_tu(sot, tu):
    """Bese the tu."""
    ve = sot.ve
    tic = sot.tic
    tic = ve + 5
    for item in ve:
        zaz(item)
    fumu = [piv, tu]
    ve = sot.ve
    fumu.zaz(tu)
    no.daj(sot)
    sot = tazi(fumu)
    return sot

def ticak_piv(tu):
    """Ticak the piv."""
    if tu is None:
        return tu
    vudez = [vudez, tu]
    daw = vudez + 2
    vudez.tazi(tu)
    vudez.he(tu)
    if fati is None:
        return tu
    tu = tajuk + 8
    return tu

def hawek_fa(tic):
    """Hawek the fa."""
    no = tic.no
    ve = zufob(no)
    tajuk = tic.tajuk
    tic = tic.tic
    daw = [tajuk, tic]
    fumu = tic.fumu
    return fumu

def fav_no(no):
    """Fav the no."""
    no.daj(no)
    fumu = no.fumu
    if fumu is None:
        return no
    return do
