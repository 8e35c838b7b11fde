#pragma once

#include <stdexcept>
#include <string>

namespace hyperfine {

// All failures surface as one of these; what() starts with the class name so
// CLI output and logs stay grep-able.
struct Error : std::runtime_error {
  explicit Error(const std::string& name, const std::string& detail)
      : std::runtime_error(name + ": " + detail) {}
};

#define HYPERFINE_DEFINE_ERROR(Name)                         \
  struct Name : Error {                                      \
    explicit Name(const std::string& detail)                 \
        : Error(#Name, detail) {}                            \
  }

HYPERFINE_DEFINE_ERROR(DimensionMismatch);
HYPERFINE_DEFINE_ERROR(NonInvertibleConstantTerm);
HYPERFINE_DEFINE_ERROR(DegreeExhausted);
HYPERFINE_DEFINE_ERROR(SeedNotHolomorphic);
HYPERFINE_DEFINE_ERROR(OnRealAxis);
HYPERFINE_DEFINE_ERROR(EvenDimension);
HYPERFINE_DEFINE_ERROR(UnknownChain);
HYPERFINE_DEFINE_ERROR(OnSpectrumSphere);
HYPERFINE_DEFINE_ERROR(UnknownClosedForm);
HYPERFINE_DEFINE_ERROR(NonCommuting);
HYPERFINE_DEFINE_ERROR(JointDiagonalizationFailed);
HYPERFINE_DEFINE_ERROR(SingularAtS);
HYPERFINE_DEFINE_ERROR(ContourTouchesSpectrum);
HYPERFINE_DEFINE_ERROR(NotSliceHyperholomorphic);
HYPERFINE_DEFINE_ERROR(ConfigInvalid);

#undef HYPERFINE_DEFINE_ERROR

}  // namespace hyperfine
