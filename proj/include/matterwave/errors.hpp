#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matterwave {

// Library errors carry a short stable name so callers (notably the CLI)
// can report the failing condition without parsing message text.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("domain-error", m) {}
};

struct SingularInputError : Error {
    explicit SingularInputError(const std::string& m) : Error("singular-input", m) {}
};

// Driving wavenumber coincides with a characteristic wavenumber of an
// undamped system; the closed form has a pole there.
struct ResonantInputError : Error {
    explicit ResonantInputError(const std::string& m) : Error("resonant-input", m) {}
};

// alpha = sqrt(E^2-1) vanished: the two characteristic branches merge and
// the general-solution matrix is singular.
struct DegenerateEigenvalueError : Error {
    explicit DegenerateEigenvalueError(const std::string& m) : Error("degenerate-eigenvalue", m) {}
};

struct UnsupportedRegimeError : Error {
    explicit UnsupportedRegimeError(const std::string& m) : Error("unsupported-regime", m) {}
};

struct UndefinedQuantityError : Error {
    explicit UndefinedQuantityError(const std::string& m) : Error("undefined-quantity", m) {}
};

struct NoDriveError : Error {
    explicit NoDriveError(const std::string& m) : Error("no-drive", m) {}
};

struct IncommensurateError : Error {
    explicit IncommensurateError(const std::string& m) : Error("incommensurate-drive", m) {}
};

struct DegenerateLatticeError : Error {
    explicit DegenerateLatticeError(const std::string& m) : Error("degenerate-lattice", m) {}
};

struct AccuracyError : Error {
    explicit AccuracyError(const std::string& m) : Error("accuracy", m) {}
};

} // namespace matterwave
