//! Holds the `acceptance` test target; it runs every acceptance criterion
//! against oracles that share no numerical code with `qmem`.
