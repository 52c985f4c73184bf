#pragma once

#include <stdexcept>
#include <string>

namespace tmsq {

// Base for every condition the library raises on purpose. Plain
// precondition violations (bad dimensions the caller controls, negative
// decay rates, ...) throw std::invalid_argument instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// iteration failed to reach its residual target
struct NonConvergence : Error {
    using Error::Error;
};

// effective coupling undefined at |delta_b| = omega_m
struct SingularDetuning : Error {
    using Error::Error;
};

// two-mode squeeze parameter needs g > G >= 0
struct InvalidRatio : Error {
    using Error::Error;
};

// eigenvalue branch tracking could not be disambiguated
struct AmbiguousTracking : Error {
    using Error::Error;
};

// spectral scan found no imaginary splitting above threshold
struct NoSplittingFound : Error {
    using Error::Error;
};

// matrix arguments disagree in size or are not in a known basis
struct DimensionMismatch : Error {
    using Error::Error;
};

// propagation left the representable range
struct NonFiniteResult : Error {
    using Error::Error;
};

// steady state requested for a non-Hurwitz drift
struct Unstable : Error {
    using Error::Error;
};

// closed-form covariance evaluated at g_eff^2 = kappa_a*kappa_b
struct StabilityPole : Error {
    using Error::Error;
};

// closed form used outside its validity region (e.g. G >= g)
struct InvalidRegime : Error {
    using Error::Error;
};

// variance fed to a log was zero or negative
struct NonPositiveVariance : Error {
    using Error::Error;
};

// relative error against a zero reference
struct ZeroReference : Error {
    using Error::Error;
};

// figure id not one of the built-in presets
struct UnknownFigure : Error {
    using Error::Error;
};

// config file/override rejected (unknown key, bad type, bad value)
struct ConfigError : Error {
    using Error::Error;
};

} // namespace tmsq
