#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Base class for all library errors. The `code()` string is stable and
/// machine-readable; messages name the violated invariant.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct SelfIntersecting : Error {
    explicit SelfIntersecting(const std::string& msg) : Error("SelfIntersecting", msg) {}
};
struct InvalidDomain : Error {
    explicit InvalidDomain(const std::string& msg) : Error("InvalidDomain", msg) {}
};
struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& msg) : Error("OutsideDomain", msg) {}
};
struct ResolutionTooCoarse : Error {
    explicit ResolutionTooCoarse(const std::string& msg) : Error("ResolutionTooCoarse", msg) {}
};
struct QuadratureOverflow : Error {
    explicit QuadratureOverflow(const std::string& msg) : Error("QuadratureOverflow", msg) {}
};
struct DegenerateField : Error {
    explicit DegenerateField(const std::string& msg) : Error("DegenerateField", msg) {}
};
struct NonConvergence : Error {
    NonConvergence(const std::string& msg, long iterations, double last_residual)
        : Error("NonConvergence", msg), iterations(iterations), last_residual(last_residual) {}
    long iterations;
    double last_residual;
};
struct LadderNotMonotone : Error {
    explicit LadderNotMonotone(const std::string& msg) : Error("LadderNotMonotone", msg) {}
};
struct NoRoot : Error {
    explicit NoRoot(const std::string& msg) : Error("NoRoot", msg) {}
};
struct BandTooThin : Error {
    explicit BandTooThin(const std::string& msg) : Error("BandTooThin", msg) {}
};
struct WrongWeight : Error {
    explicit WrongWeight(const std::string& msg) : Error("WrongWeight", msg) {}
};
struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& msg) : Error("InvalidConfig", msg) {}
};

} // namespace hardy
