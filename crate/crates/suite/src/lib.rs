//! Holds the `acceptance` test target; the checks themselves live in
//! `semigroup_ergodic::acceptance` so that `selftest` can run them too.
