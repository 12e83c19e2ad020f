//! Rows as printed in the published tables, one whitespace-separated row per line.

#![allow(dead_code)]

pub const T1: &str = "\
4 1 2 6 2 4 4 0.0
16 3 4 60 12 38 46 0.1333
64 7 8 504 56 394 442 0.0952
256 15 16 4080 240 3602 3826 0.0549
9 2 3 24 6 14 17 0.1250
81 8 9 720 72 578 641 0.0875
729 26 27 19656 702 18254 18929 0.0343
6561 80 81 531360 6480 518402 524801 0.0120
25 4 5 120 20 82 97 0.1250
625 24 25 15600 600 14402 14977 0.0369
15625 124 125 1953000 15500 1922002 1937377 0.0079
390625 624 625 244140000 390000 243360002 243749377 0.0016
49 6 7 336 42 254 289 0.1042
2401 48 49 117600 2352 112898 115201 0.0196
117649 342 343 40353264 117306 40118654 40235617 0.0029
5764801 2400 2401 13841284800 5762400 13829760002 13835520001 0.0004";

pub const T2: &str = "\
4 240 0 12 142 226 0.35
4 240 1 24 122 209 0.3625
4 240 2 36 102 192 0.375
4 240 3 48 82 175 0.3875
4 240 4 60 62 158 0.4
5 600 0 20 392 577 0.3083
5 600 3 80 302 499 0.3283
5 600 5 120 242 447 0.3416
7 2352 0 42 1738 2305 0.2410
7 2352 3 168 1570 2155 0.2487
7 2352 7 336 1346 1955 0.2589
11 14520 0 110 12014 14401 0.1643
11 14520 5 660 11354 13791 0.1678
11 14520 11 1320 10562 13059 0.1719
13 28392 0 156 24208 28225 0.1414
13 28392 13 2184 21842 26015 0.1469";

pub const T3: &str = "\
0 4 0.006 669 725
60 244 0.334 129 305
74 300 0.412 3* 207";

pub const T4: &str = "\
0 16 0.001 14845 15607
572 9168 0.587 545 3595
593 9504 0.608 20* 3154";

pub const T5: &str = "\
3 2 74 81 2 729 300 3 129 0.415 0.533
3 3 700 729 2 19683 5608 27 1539 0.285 0.457
3 4 6451 6561 2 531441 103232 54 17793 0.194 0.406
5 2 593 625 4 15625 9504 20 545 0.608 0.711
5 3 15398 15625 4 1953125 985536 25 19025 0.505 0.656
5 4 389122 390625 4 244140625 99615488 375 626625 0.408 0.618
7 2 2329 2401 6 117649 83880 28 1449 0.712 0.791
7 3 116911 117649 6 40353607 25252992 294 101479 0.626 0.750
7 4 5757938 5764801 6 13841287201 7462288944 343 6593489 0.539 0.720";

pub const T6: &str = "\
3 2 2 729 4 669 725 0.0768
3 3 2 19683 8 18927 19672 0.0378
3 4 2 531441 16 522585 531415 0.0166
5 2 4 15625 16 14845 15607 0.0488
5 3 4 1953125 64 1924775 1953044 0.0145
5 4 4 244140625 256 243201625 244140289 0.0038
7 2 6 117649 36 114149 117609 0.0294
7 3 6 40353607 216 40100767 40353352 0.0063
7 4 6 13841287201 1296 13824809481 13841285651 0.0012";
