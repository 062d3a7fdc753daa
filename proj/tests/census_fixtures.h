// Frozen regression inputs: deterministic perturbations of the built-in
// figure-eight and (2,5)-torus 40-gons, with their full quadrisecant
// censuses captured from an independent exhaustive solve.
#pragma once

#include "knotsec/geom3.hpp"

#include <vector>

namespace census {

using knotsec::Point3;

// count 26: 16 alternating, 8 flipped, 2 simple
inline const std::vector<Point3> kFig8Perturbed40 = {
    {2.9999925714040554, -1.4442751197700867e-08, 2.0299671524671492e-06},
    {2.6294011830477459, 1.3397445811141742, 0.58779381651293239},
    {1.6510901711440462, 2.2725350814163567, 0.95106548286421932},
    {0.40482123925322799, 2.5559227015157973, 0.95105674409558971},
    {-0.71352223470337062, 2.1960011649128592, 0.58777801165393062},
    {-1.4142078015812047, 1.4142169695847773, 2.4764626978567281e-07},
    {-1.608214071715351, 0.52254346744274616, -0.58777563401968713},
    {-1.3948339505380021, -0.22091798397229409, -0.95105684380121502},
    {-0.96352842606532008, -0.7000404145312904, -0.95106181027052028},
    {-0.47620433231202891, -0.9346081408148561, -0.58779267709904881},
    {-6.5853586541827398e-07, -1.0000044571021494, -8.3376600455400831e-06},
    {0.47621829525186837, -0.9346168885120526, 0.58777820611847142},
    {0.96352895880956657, -0.70004820211681396, 0.95106454491672732},
    {1.3948223836923763, -0.22092839708580433, 0.95105053167423692},
    {1.6082173214015456, 0.52254186410063652, 0.58779337497925122},
    {1.4142175095948699, 1.4142103487863094, -9.6624556976826509e-06},
    {0.71351868803630392, 2.1960155874540543, -0.58778605797287498},
    {-0.4048149807830424, 2.555916415014551, -0.95106583528957445},
    {-1.6510918449303935, 2.2725442435761822, -0.95106034210028967},
    {-2.6294142617348135, 1.3397434073375698, -0.5877917989004513},
    {-3.0000095082778508, 6.782496968557816e-06, -6.7393605642655653e-07},
    {-2.6294180652092587, -1.3397468376549988, 0.5877791653490716},
    {-1.6511075243278257, -2.272540518095219, 0.95106443145018771},
    {-0.40482826271314304, -2.5559192189335249, 0.95105031969548837},
    {0.713517349590853, -2.1960152994958313, 0.58778111179381387},
    {1.4142181046079729, -1.414213698794077, 7.0583998897028781e-06},
    {1.6082147506701412, -0.52254618228242666, -0.58779008947543554},
    {1.3948376067499748, 0.22092787869944519, -0.9510597025716363},
    {0.96352421159249346, 0.70003853282994322, -0.95105158611680762},
    {0.47620117662775685, 0.93460683626455443, -0.58778717154072435},
    {-5.0981189771676296e-06, 1.000006904499634, 4.8361419287710141e-06},
    {-0.47620946048605423, 0.93461871699617916, 0.5877890978746062},
    {-0.96351987046595267, 0.70005079648931223, 0.95104951099862911},
    {-1.394825518124073, 0.22091193100841586, 0.95105537891397951},
    {-1.6082146807482989, -0.52253459198149077, 0.58779043685555632},
    {-1.4142228542090129, -1.4142163741315665, -6.7388633507121694e-06},
    {-0.7135155155126699, -2.1960127784293904, -0.58779036600361556},
    {0.40481594597562343, -2.5559341039192649, -0.95104910859681246},
    {1.6511014899609626, -2.2725492909725671, -0.95105655092399966},
    {2.6294021826627514, -1.3397494029967352, -0.58779061902791196},
};
// count 10: all alternating
inline const std::vector<Point3> kTorus25Perturbed40 = {
    {2.9999950164891622, 8.9350588571884915e-06, -6.2135923092047745e-06},
    {2.5746051303824729, 0.83653899875911719, -0.70711217036161567},
    {1.6180373976647504, 1.1755628061725887, -0.99999207381252586},
    {0.7599507294172746, 1.0459626424728543, -0.70710595186331315},
    {0.30900913140042791, 0.95105167539432878, -1.662079187460411e-06},
    {-9.276775628553029e-07, 1.2928925817452712, 0.70711533152056494},
    {-0.61803881332810617, 1.9021067903945228, 1.000003410209481},
    {-1.5911885099883323, 2.190103847785088, 0.70711438618654621},
    {-2.4270596960109234, 1.7633644907999182, 2.9848073813344372e-06},
    {-2.5746041134373541, 0.83654016294366684, -0.70711239338785714},
    {-1.9999941405984625, 3.232689420080603e-06, -0.99999442319815957},
    {-1.2296204937323929, -0.39953328949073796, -0.70710150868475563},
    {-0.80902658980047337, -0.58777634027884706, -7.2982427501820843e-06},
    {-0.75994156460178275, -1.0459742057912507, 0.70710325908759064},
    {-0.6180405838244637, -1.9021074249342809, 1.0000082904917451},
    {4.5774276367268494e-06, -2.7071047754907953, 0.7071110102639544},
    {0.92705170489697186, -2.853168383578625, 8.1216774034813823e-06},
    {1.5911930951706097, -2.1901009472896131, -0.70709784182245328},
    {1.6180428510834255, -1.1755709846424007, -0.99999398443997789},
    {1.2296193856258575, -0.39951699120306172, -0.70711514712076329},
    {1.0000079631439502, 2.4769531142118864e-09, -1.0207323691480368e-06},
    {1.2296182558286306, 0.3995283060619228, 0.70710551191298676},
    {1.618029810892865, 1.1755788778634673, 1.0000063762111346},
    {1.591189491634029, 2.1900934810243213, 0.70711204922982429},
    {0.9270585643117728, 2.8531787934740396, -5.1855822125807438e-06},
    {7.8347370035293839e-06, 2.7071106785978212, -0.70711541712290837},
    {-0.61803977617304084, 1.9021068064300317, -1.0000084521899641},
    {-0.75993981860798465, 1.0459687887457787, -0.70710294572126242},
    {-0.8090253602046984, 0.58779267649004141, 3.9114628731809136e-06},
    {-1.2296088773573663, 0.39952810548388545, 0.70710593569884428},
    {-2.0000061396561923, 8.8472563230169636e-06, 0.99999290886898895},
    {-2.5746111177221307, -0.83654957231191152, 0.70709894906246662},
    {-2.4270470480209352, -1.7633479810900727, -7.768142645831845e-07},
    {-1.5911915505346184, -2.1900882001042183, -0.70710607257058866},
    {-0.61802847883057954, -1.9021171736630544, -1.0000069974071975},
    {-6.217894847513539e-06, -1.292903077214572, -0.70711535702195205},
    {0.30902201715087674, -0.95104844986117199, -8.8549088087689123e-06},
    {0.75994798538470487, -1.045967032729737, 0.70711040573282513},
    {1.6180339688205199, -1.1755707942235316, 1.000003893374829},
    {2.5746064456077606, -0.83653694929650724, 0.7071006274280156},
};

}  // namespace census
