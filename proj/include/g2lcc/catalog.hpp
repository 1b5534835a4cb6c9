#pragma once

// Regression catalog: each entry is a structure file whose `expect` lines
// are recomputed and compared.
//
//   expect <check> <args>... source=<published|trivial|derived:<operation>> [status=expected_fail]
//
// Checks (names refer to forms, vectors and matrices of the entry; inline
// forms are parsed in the algebra's dimension):
//   g2_metric PHI identity
//   g2_class PHI TAG [theta=FORM]
//   su3_class OMEGA PSI TAG [c=SCALAR]
//   su3_metric OMEGA PSI identity
//   extend OMEGA PSI D salamon=STRING
//   nk_torus OMEGA PSI
//   automorphism NU [preserves=FORM_NAME]
//   interior PHI X FORM
//   lie_derivative PHI X zero|nonzero
//   dtheta PHI theta=FORM gamma=FORM equals|not_proportional
//   dtheta_solve PHI theta=FORM exact [rank=N] [kernel=N]
//   reduce PHI N omega=FORM6 psi_plus=FORM6
//   lattice D t=SCALAR [basis=B] [integral|not_integral] [unimodular] [matrix=M]
//
// An entry also checks that its file text is canonical (format() reproduces
// it byte for byte).

#include <filesystem>
#include <string>
#include <vector>

#include "g2lcc/forms.hpp"
#include "g2lcc/structure_file.hpp"

namespace g2lcc {

/// Threshold above which a quantity counts as nonzero in `nonzero` and
/// `not_proportional` checks.
inline constexpr double kNonzeroThreshold = 1e-3;

struct CheckResult {
  enum class Status { Pass, Fail, ExpectedFail };
  std::string check;
  std::size_t line = 0;
  Status status = Status::Fail;
  std::string source;
  std::string detail;
};

const char* to_string(CheckResult::Status status);

struct EntryReport {
  std::string name;
  std::vector<CheckResult> checks;
  std::string error;  // load or parse failure; the entry fails
  bool passed() const;
};

struct CatalogReport {
  std::vector<EntryReport> entries;
  bool passed() const;
  int count(CheckResult::Status status) const;
};

std::filesystem::path default_catalog_dir();
/// Entry names (file stems of *.txt), sorted.
std::vector<std::string> catalog_entries(const std::filesystem::path& dir = default_catalog_dir());
/// Throws ParseError prefixed with the entry name.
StructureFile load_entry(const std::string& name, const std::filesystem::path& dir = default_catalog_dir());

EntryReport verify(const std::string& name, const StructureFile& file, const std::string& text,
                   double tol = kTolerance);
/// Loads and verifies one entry; parse failures propagate.
EntryReport verify(const std::string& name, const std::filesystem::path& dir = default_catalog_dir(),
                   double tol = kTolerance);
/// Entries are verified concurrently; the report lists them in name order.
CatalogReport verify_all(const std::filesystem::path& dir = default_catalog_dir(), double tol = kTolerance);

}  // namespace g2lcc
