#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rft {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define RFT_ERROR(Name)                                              \
  struct Name : Error {                                              \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  }

RFT_ERROR(NonTraceless);
RFT_ERROR(DefectiveMatrix);
RFT_ERROR(DomainError);
RFT_ERROR(InvalidDim);
RFT_ERROR(GrazingMode);
RFT_ERROR(QuadratureFailure);
RFT_ERROR(EmptySet);
RFT_ERROR(ParamBlowup);
RFT_ERROR(NonFinite);
RFT_ERROR(PoleHit);
RFT_ERROR(SingularBlock);
RFT_ERROR(ParseError);

#undef RFT_ERROR

/// Carries the residual history of the failed iteration.
struct NoConvergence : Error {
  NoConvergence(const std::string& what, std::vector<double> history)
      : Error(what), residual_history(std::move(history)) {}
  const char* kind() const noexcept override { return "NoConvergence"; }
  std::vector<double> residual_history;
};

/// Aggregates every validation problem found in a config.
struct ValidationError : Error {
  explicit ValidationError(std::vector<std::string> msgs)
      : Error(join(msgs)), messages(std::move(msgs)) {}
  const char* kind() const noexcept override { return "ValidationError"; }
  std::vector<std::string> messages;

 private:
  static std::string join(const std::vector<std::string>& m) {
    std::string s;
    for (const auto& x : m) {
      if (!s.empty()) s += "; ";
      s += x;
    }
    return s;
  }
};

}  // namespace rft
