#ifndef FQDYN_ERROR_HPP
#define FQDYN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fqdyn {

enum class Errc {
    CompositeModulus,
    NoEmbedding,
    DivisionByZeroPoly,
    NotAPthPower,
    ZeroPolynomial,
    ZeroDenominator,
    ConstantMap,
    DegreeOverflow,
    InseparableUnreduced,
    NotInMq,
    SingularMatrix,
    FixedPointClash,
    OrbitCapExceeded,
    OutsideScope,
    ParseError,
    DomainError,
    Inconsistency,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::CompositeModulus: return "CompositeModulus";
        case Errc::NoEmbedding: return "NoEmbedding";
        case Errc::DivisionByZeroPoly: return "DivisionByZeroPoly";
        case Errc::NotAPthPower: return "NotAPthPower";
        case Errc::ZeroPolynomial: return "ZeroPolynomial";
        case Errc::ZeroDenominator: return "ZeroDenominator";
        case Errc::ConstantMap: return "ConstantMap";
        case Errc::DegreeOverflow: return "DegreeOverflow";
        case Errc::InseparableUnreduced: return "InseparableUnreduced";
        case Errc::NotInMq: return "NotInMq";
        case Errc::SingularMatrix: return "SingularMatrix";
        case Errc::FixedPointClash: return "FixedPointClash";
        case Errc::OrbitCapExceeded: return "OrbitCapExceeded";
        case Errc::OutsideScope: return "OutsideScope";
        case Errc::ParseError: return "ParseError";
        case Errc::DomainError: return "DomainError";
        case Errc::Inconsistency: return "Inconsistency";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace fqdyn

#endif
