//! Holds the `acceptance` test target, which checks the library and the
//! command line together against the numbered acceptance criteria.
