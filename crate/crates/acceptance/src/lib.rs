//! Holds the `acceptance` test target, which runs after the `pvq` suites.
