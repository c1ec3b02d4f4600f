#pragma once

#include <stdexcept>
#include <string>

namespace vsg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite input to a pointwise constitutive evaluation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Field rank or grid incompatible with the requested operation.
class RankMismatch : public Error {
public:
    using Error::Error;
};

/// Argument outside its documented range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Initial data violating the involution (curl F != 0) or containing NaNs.
class InadmissibleData : public Error {
public:
    using Error::Error;
};

/// Not enough usable points for a fit or a refinement comparison.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Malformed snapshot or CSV payload.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration file entry. Carries the offending key and line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : Error(format(key, line, what)), key_(key), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string msg = "config";
        if (line > 0) msg += ":" + std::to_string(line);
        if (!key.empty()) msg += ": " + key;
        return msg + ": " + what;
    }

    std::string key_;
    int line_;
};

/// The time integrator produced a non-finite state.
class BlowUp : public Error {
public:
    BlowUp(double t, double norm, const std::string& what) : Error(what), t_(t), norm_(norm) {}

    double time() const noexcept { return t_; }
    double norm() const noexcept { return norm_; }

private:
    double t_;
    double norm_;
};

}  // namespace vsg
