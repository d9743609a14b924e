"""
Worked-example tensor over (2,3)x(2,3) and its inverses, as printed.

Each entry maps a column multi-index "kl" to the 2x3 slice over (i, j),
rows separated by '/'. Values are exact rationals; the core-EP based
blocks were published as rational approximations.
"""

D_BLOCKS = {
    "11": "1 -1 1 / 1 1 -1",
    "12": "1 0 -1 / 1 0 0",
    "13": "1 0 -1 / 1 -1 0",
    "21": "0 0 1 / -1 0 -1",
    "22": "0 -1 -1 / 1 -1 0",
    "23": "1 1 -1 / 1 0 1",
}

MP_BLOCKS = {
    "11": "1/8 1/8 5/16 / 5/16 -3/16 3/16",
    "12": "-1/8 -1/8 3/16 / 3/16 -5/16 5/16",
    "13": "1/2 -3/2 1/2 / 0 0 1/2",
    "21": "3/8 -5/8 3/16 / -5/16 3/16 5/16",
    "22": "0 1 -3/4 / -1/4 -1/4 -1/4",
    "23": "1/8 -7/8 1/16 / -7/16 1/16 7/16",
}

DRAZIN_BLOCKS = {
    "11": "1/16 37/64 -123/256 / 19/256 23/256 151/256",
    "12": "-1/16 19/64 -93/256 / 5/256 -31/256 97/256",
    "13": "-1/8 5/32 -39/128 / -1/128 -29/128 35/128",
    "21": "1/16 9/64 -15/256 / 7/256 27/256 27/256",
    "22": "1/4 -1/16 -13/64 / 21/64 -1/64 -1/64",
    "23": "-7/16 5/64 -11/256 / -93/256 -89/256 39/256",
}

CORE_EP_BLOCKS = {
    "11": "163/1011 733/2816 -445/1726 / 1021/6291 779/6405 845/3233",
    "12": "-349/2688 493/4236 -2002/9523 / -412/9359 -191/1704 92/455",
    "13": "367/3039 -120/1921 -284/2425 / 458/2543 -277/9589 -30/9589",
    "21": "3/8 -5/8 3/16 / -5/16 3/16 5/16",
    "22": "0 1 -3/4 / -1/4 -1/4 -1/4",
    "23": "1/8 -7/8 1/16 / -7/16 1/16 7/16",
}

MPD_BLOCKS = {
    "11": "1/16 37/64 -11/64 / -15/64 -7/32 9/32",
    "12": "-1/16 19/64 -13/64 / -9/64 -9/32 7/32",
    "13": "-1/8 5/32 -7/32 / -3/32 -5/16 3/16",
    "21": "1/16 9/64 1/64 / -3/64 1/32 1/32",
    "22": "1/4 -1/16 -1/16 / 3/16 -1/8 -1/8",
    "23": "-7/16 5/64 -11/64 / -15/64 -7/32 9/32",
}

DMP_BLOCKS = {
    "11": "5/32 67/128 -233/512 / 81/512 77/512 269/512",
    "12": "-5/32 45/128 -199/512 / -33/512 -93/512 227/512",
    "13": "-1/8 5/32 -39/128 / -1/128 -29/128 35/128",
    "21": "-1/32 25/128 -43/512 / -29/512 23/512 87/512",
    "22": "1/4 -1/16 -13/64 / 21/64 1/64 1/64",
    "23": "-11/32 3/128 -9/512 / -143/512 -147/512 45/512",
}

MPCEP_BLOCKS = {
    "11": "163/1011 733/2816 -232/4067 / -369/9589 -172/2173 232/3829",
    "12": "-349/2688 493/4236 -427/2589 / -225/2519 -1452/6245 257/1638",
    "13": "367/3039 -120/1921 -253/4979 / 343/3014 -89/935 -181/2607",
    "21": "411/3445 564/2833 65/1589 / -55/1006 447/6343 229/9121",
    "22": "299/2177 589/2330 -647/3241 / -118/13841 -377/1265 581/5434",
    "23": "-371/2160 150/2719 -244/3643 / -559/5298 -107/1291 453/3731",
}

CEPMP_BLOCKS = {
    "11": "163/1011 733/2816 -445/1726 / 1021/6291 779/6405 845/3233",
    "12": "-349/2688 623/5353 -2002/9523 / -412/9359 -319/1704 92/455",
    "13": "367/3039 -120/1921 -284/2425 / 458/2543 -277/9589 -30/9589",
    "21": "411/3445 564/2833 -289/4009 / 301/5161 162/883 1037/7509",
    "22": "299/2177 589/2330 -467/1038 / 271/1121 -191/4000 509/1425",
    "23": "-371/2160 150/2719 -385/15718 / -358/2419 -644/5137 263/3332",
}

CMP_BLOCKS = {
    "11": "5/32 67/128 -17/128 / -21/128 -11/64 13/64",
    "12": "-5/32 45/128 -31/128 / -27/128 -21/64 19/64",
    "13": "-1/8 5/32 -7/32 / -3/32 -5/16 3/16",
    "21": "-1/32 25/128 -3/128 / -15/128 -1/64 7/64",
    "22": "1/4 -1/16 -1/16 / 3/16 -1/8 -1/8",
    "23": "-11/32 3/128 -17/128 / -21/128 -11/64 13/64",
}

# (kind, 1-based (i, j, k, l), printed, corrected). Whole-block misprints of
# the core-EP slices kl = 21, 22, 23 are listed entry by entry in problems.py.
ERRATA = [
    ("drazin", (2, 2, 2, 2), "-1/64", "1/64"),
    ("drazin", (2, 3, 2, 2), "-1/64", "1/64"),
    ("core-ep", (2, 2, 1, 2), "-191/1704", "-319/1704"),
]
