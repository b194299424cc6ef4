#pragma once

// Tr J for |n><n|, principal value, from fisher_fock.py (mpmath, 60 digits).
namespace oracle {

inline constexpr double kFockTraceJ[] = {
    4.0,  // n = 0
    2.898006805794919,  // n = 1
    5.3553301321101318,  // n = 2
    3.8662810417599079,  // n = 3
    6.1351148541703352,  // n = 4
    4.5310089266987181,  // n = 5
    6.7200897590111654,  // n = 6
    5.0570144350025728,  // n = 7
    7.2001699512407186,  // n = 8
    5.5002135520968304,  // n = 9
    7.6128871799061538,  // n = 10
};

}  // namespace oracle
