#pragma once

#include <string>
#include <vector>

#include "driftlab/oracle.hpp"

namespace driftlab {

/// The appendix counterexamples as executable instances. Where the printed
/// text is inconsistent with its own proof the corrected construction is
/// used (CE1 membership hypothesis, CE3 learner case order, ELL2 constant).
enum class FixtureId { CE1, CE2, CE3, CE4, ELL1, ELL2, XOR };

std::vector<FixtureId> all_fixture_ids();
std::string fixture_name(FixtureId id);
FixtureId parse_fixture(const std::string& name);

/// Expected verdicts; constants are exact rationals except for XOR, whose
/// witness constant is re-derived by enumeration (checked as a band).
struct ExpectedReport {
  bool strong = false;
  double strong_C = 0.0;
  bool weak_12 = false, weak_21 = false;
  bool ell_12 = false, ell_21 = false;
  double ell_12_C = 0.0, ell_21_C = 0.0;
  LossRelation relation = LossRelation::Constant;
  double discrepancy = 0.0;
  double min_loss_1 = 0.0, min_loss_2 = 0.0;
  bool exact_strong_C = true;  // false: only check sign/band (XOR)
};

struct Fixture {
  FixtureId id;
  std::string name;
  DriftProcess process;
  FiniteHypothesisClass cls;
  Loss loss = Loss::ZeroOne;
  TimeWindow w1, w2;
  ExpectedReport expected;
  std::string note;
};

Fixture make_fixture(FixtureId id);

/// Compares the computed report against the fixture expectation and checks
/// that reported witnesses re-verify under expected_loss. Returns one
/// message per mismatch; empty means the fixture reproduces.
std::vector<std::string> fixture_mismatches(const Fixture& f, double tol = kTol);

/// The non-consistent learner "A(S) = h2" used against CE2.
CountsLearner ce2_inconsistent_learner();

/// The corrected case learner of the A-drift-without-weak-drift example:
/// picks 1[x > 1/2] when (1,1) is absent from the sample, else 1[x > -1/2].
CountsLearner ce3_inconsistent_learner();

}  // namespace driftlab
