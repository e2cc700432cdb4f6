"""Low-pass (scaling) filter coefficient tables, c = h_0..h_{2N-1}, sum = sqrt(2).

Generated at 60-digit precision by tools/make_filters.py; the loader verifies
the QMF invariants rather than trusting this table.
"""

LOWPASS = {
    "haar": (1, [
        0.70710678118654752,
        0.70710678118654752,
    ]),
    "db2": (2, [
        0.48296291314453414,
        0.83651630373780791,
        0.22414386804201338,
        -0.12940952255126038,
    ]),
    "db3": (3, [
        0.33267055295008262,
        0.80689150931109258,
        0.45987750211849157,
        -0.13501102001025459,
        -0.085441273882026662,
        0.035226291885709537,
    ]),
    "db4": (4, [
        0.2303778133088965,
        0.71484657055291565,
        0.63088076792985891,
        -0.027983769416859854,
        -0.18703481171909308,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ]),
    "db5": (5, [
        0.16010239797419291,
        0.60382926979718967,
        0.72430852843777293,
        0.13842814590132073,
        -0.24229488706638203,
        -0.032244869584638375,
        0.077571493840045714,
        -0.0062414902127982743,
        -0.012580751999081999,
        0.0033357252854737713,
    ]),
    "db6": (6, [
        0.11154074335010946,
        0.49462389039845309,
        0.75113390802109535,
        0.31525035170919763,
        -0.22626469396543982,
        -0.12976686756726194,
        0.097501605587323049,
        0.027522865530305729,
        -0.03158203931748603,
        0.00055384220116149614,
        0.0047772575109455106,
        -0.0010773010853084796,
    ]),
    "db7": (7, [
        0.077852054085009179,
        0.39653931948191731,
        0.72913209084623512,
        0.46978228740519312,
        -0.14390600392856498,
        -0.22403618499387498,
        0.071309219266830265,
        0.080612609151083072,
        -0.038029936935014414,
        -0.016574541630666881,
        0.012550998556099841,
        0.00042957797292136652,
        -0.0018016407040474909,
        0.00035371379997452025,
    ]),
    "db8": (8, [
        0.05441584224310401,
        0.31287159091429997,
        0.67563073629728981,
        0.58535468365420671,
        -0.015829105256349306,
        -0.28401554296154693,
        0.00047248457391328277,
        0.12874742662047846,
        -0.017369301001807546,
        -0.044088253930794752,
        0.013981027917398282,
        0.0087460940474057767,
        -0.0048703529934515743,
        -0.00039174037337694705,
        0.00067544940645056937,
        -0.00011747678412476953,
    ]),
    "db9": (9, [
        0.038077947363878347,
        0.24383467461259035,
        0.60482312369011111,
        0.65728807805130054,
        0.13319738582500758,
        -0.29327378327917491,
        -0.096840783222976461,
        0.14854074933810638,
        0.030725681479333379,
        -0.067632829061329974,
        0.00025094711483145196,
        0.022361662123679097,
        -0.0047232047577513973,
        -0.0042815036824634298,
        0.0018476468830562265,
        0.00023038576352319597,
        -0.00025196318894271014,
        3.9347320316271599e-5,
    ]),
    "db10": (10, [
        0.026670057900555554,
        0.18817680007769149,
        0.52720118893172559,
        0.68845903945360357,
        0.28117234366057746,
        -0.24984642432731538,
        -0.19594627437737704,
        0.12736934033579326,
        0.093057364603572351,
        -0.071394147166397087,
        -0.029457536821875813,
        0.033212674059341002,
        0.0036065535669561697,
        -0.010733175483330575,
        0.0013953517470529012,
        0.0019924052951850561,
        -0.00068585669495971163,
        -0.00011646685512928545,
        9.3588670320069591e-5,
        -1.3264202894521245e-5,
    ]),
    "sym4": (4, [
        0.032223100604051468,
        -0.012603967262031304,
        -0.099219543576633533,
        0.29785779560530605,
        0.80373875180513208,
        0.49761866763277499,
        -0.029635527646002492,
        -0.075765714789502213,
    ]),
    "sym5": (5, [
        0.019538882735249827,
        -0.021101834024689041,
        -0.17532808990805622,
        0.016602105764510848,
        0.63397896345679206,
        0.72340769040404079,
        0.1993975339768556,
        -0.039134249302313844,
        0.029519490925706261,
        0.027333068344998769,
    ]),
    "sym6": (6, [
        -0.0078007083250323804,
        0.0017677118642540077,
        0.044724901770781385,
        -0.021060292512370848,
        -0.072637522786376583,
        0.33792942172816583,
        0.787641141028651,
        0.49105594192797373,
        -0.048311742585698055,
        -0.11799011114852003,
        0.0034907120842221625,
        0.015404109327044824,
    ]),
    "sym7": (7, [
        0.002681814568260147,
        -0.0010473848886797381,
        -0.012636303403240567,
        0.030515513165877886,
        0.067892693501220565,
        -0.049552834937042832,
        0.017441255086835707,
        0.53610191709056923,
        0.76776431700488293,
        0.28862963175064787,
        -0.14004724044293365,
        -0.10780823770328971,
        0.0040102448715223952,
        0.010268176708464816,
    ]),
    "sym8": (8, [
        0.0018899503327676892,
        -0.00030292051472413308,
        -0.014952258337062199,
        0.0038087520138944895,
        0.049137179673730287,
        -0.027219029917103486,
        -0.051945838107881801,
        0.36444189483617894,
        0.77718575169962803,
        0.48135965125905339,
        -0.061273359067811078,
        -0.14329423835127266,
        0.0076074873249766082,
        0.031695087811525991,
        -0.00054213233180001069,
        -0.0033824159510050026,
    ]),
    "sym9": (9, [
        0.0010694900329086119,
        -0.00047315449868004354,
        -0.01026406402763312,
        0.0088592674934002667,
        0.062077789302885748,
        -0.018233770779395506,
        -0.19155083129728433,
        0.035272488035271043,
        0.61733844914093415,
        0.7178970827644124,
        0.23876091460730517,
        -0.054568958430833351,
        0.00058346274612498183,
        0.030224878858275188,
        -0.011528210207679186,
        -0.013271967781817134,
        0.00061978088898550708,
        0.0014009155259146562,
    ]),
    "sym10": (10, [
        -0.00045932942100465204,
        5.7036083618495007e-5,
        0.0045931735853117919,
        -0.0008043589320164513,
        -0.020354939812311111,
        0.0057649120335811497,
        0.049994972077375156,
        -0.031990056882428114,
        -0.035536740473819586,
        0.38382676106707633,
        0.76951003702109794,
        0.47169066693844291,
        -0.070880535783231572,
        -0.15949427888491061,
        0.011609893903711318,
        0.045927239231091509,
        -0.0014653825813046105,
        -0.0086412992770221503,
        9.5632670722852731e-5,
        0.00077015980911445982,
    ]),
}
