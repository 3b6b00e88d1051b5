# 256-bit mpmath reference values for the bound calculator tests.
# Run: python3 bound_reference.py
from mpmath import mp, mpf, log, sqrt, findroot, ln
mp.prec = 256
def h(p):
    p = mpf(p)
    if p == 0 or p == 1: return mpf(0)
    return -p*log(p,2) - (1-p)*log(1-p,2)
def hinv(z):
    lo, hi = mpf(1)/2, mpf(1)
    for _ in range(400):
        mid = (lo+hi)/2
        if h(mid) > z: lo = mid
        else: hi = mid
    return (lo+hi)/2
def upper(z): return mpf(1)/2 + sqrt(1 - mpf(z)**ln(4))/2
print("h(0.11)", mp.nstr(h(mpf('0.11')), 20))
print("hinv(0.5)", mp.nstr(hinv(mpf('0.5')),20), "sq", mp.nstr(hinv(mpf('0.5'))**2, 20))
N=mpf(2)**43; L=mpf(2)**40; m=128; k=500; s=2; T=510
def parts(q, p=0, closed=False):
    q=mpf(q); alpha = L + m*(q+1) + T
    z = 1 - (alpha+k)/N
    t1 = q/(s+1)*(4*m*q/mpf(2)**m)**s
    base = upper(z) if closed else hinv(z)
    t2 = q*T/2*base**(mpf(k)/2)
    t3 = q*p/mpf(2)**(m-1); t4 = q*T/mpf(2)**m
    return t1,t2,t3,t4,z
for e in (10,20,30):
    for c in (False, True):
        t1,t2,t3,t4,z = parts(mpf(2)**e, closed=c)
        print(e, c, "total", mp.nstr(t1+t2+t3+t4, 20), "gamma", mp.nstr(t1+t2,20), "t1", mp.nstr(t1,10), "t2", mp.nstr(t2,10), "z", mp.nstr(z,20))
# crossing
lo, hi = mpf(2)**10, mpf(2)**40
for _ in range(200):
    mid = sqrt(lo*hi)
    t1,t2,_,_,_ = parts(mid)
    if t1+t2 > mpf(1)/2: hi = mid
    else: lo = mid
print("crossing log2 q", mp.nstr(log(lo,2), 12))
print("hinv grid", [mp.nstr(hinv(mpf(i)/10),15) for i in range(1,10)])

def gamma(q, closed=False, T_=T, kexp=None):
    q=mpf(q); alpha = L + m*(q+1) + T_
    z = 1 - (alpha+k)/N
    if z < 0: return None
    base = upper(z) if closed else hinv(z)
    e = mpf(k)/2 if kexp is None else kexp
    return q/(s+1)*(4*m*q/mpf(2)**m)**s + q*T_/2*base**e
def cross(f, target):
    lo, hi = mpf(2)**5, mpf(2)**40
    for _ in range(120):
        mid = sqrt(lo*hi)
        v = f(mid)
        if v is None or v > target(mid): hi = mid
        else: lo = mid
    return mp.nstr(log(lo,2), 8)
naive = lambda q: q*mpf(2)**33/(4*mpf(2)**128)
print("Gamma=1/2 closed-form", cross(lambda q: gamma(q,True), lambda q: mpf(1)/2))
print("Gamma=1/2 T=s(m-1)", cross(lambda q: gamma(q,T_=254), lambda q: mpf(1)/2))
print("Gamma=1/2 exponent k", cross(lambda q: gamma(q,kexp=k), lambda q: mpf(1)/2))
print("Gamma=1", cross(lambda q: gamma(q), lambda q: mpf(1)))
print("Gamma=naive", cross(lambda q: gamma(q), naive))
print("Gamma=12 naive", cross(lambda q: gamma(q), lambda q: 12*naive(q)))
