#ifndef QUASIKERNEL_ERROR_HPP
#define QUASIKERNEL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace quasikernel {

enum class errc {
  fuel_exhausted,
  unbound_name,
  type_mismatch,
  incomparable_types,
  not_polynomial,
  not_extended_polynomial,
  tag_out_of_range,
  syntax_error,
  negative_occurrence,
  unsupported_type_former,
  invariant_violation,
  not_in_carrier,
  subtype_escape,
  non_enumerable_exponent,
  domain_mismatch,
  non_disjoint_fibers,
  not_stabilized,
  non_monotone,
  not_continuous,
  empty_constant_type,
  invalid_argument,
};

inline std::string_view to_string(errc code) {
  switch (code) {
    case errc::fuel_exhausted: return "FuelExhausted";
    case errc::unbound_name: return "UnboundName";
    case errc::type_mismatch: return "TypeMismatch";
    case errc::incomparable_types: return "IncomparableTypes";
    case errc::not_polynomial: return "NotPolynomial";
    case errc::not_extended_polynomial: return "NotExtendedPolynomial";
    case errc::tag_out_of_range: return "TagOutOfRange";
    case errc::syntax_error: return "SyntaxError";
    case errc::negative_occurrence: return "NegativeOccurrence";
    case errc::unsupported_type_former: return "UnsupportedTypeFormer";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::not_in_carrier: return "NotInCarrier";
    case errc::subtype_escape: return "SubtypeEscape";
    case errc::non_enumerable_exponent: return "NonEnumerableExponent";
    case errc::domain_mismatch: return "DomainMismatch";
    case errc::non_disjoint_fibers: return "NonDisjointFibers";
    case errc::not_stabilized: return "NotStabilized";
    case errc::non_monotone: return "NonMonotone";
    case errc::not_continuous: return "NotContinuous";
    case errc::empty_constant_type: return "EmptyConstantType";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the failure
/// class; the message carries the offending value or position.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace quasikernel

#endif
