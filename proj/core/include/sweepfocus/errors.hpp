#pragma once

#include <stdexcept>
#include <string>

namespace sweepfocus {

/// Input that fails validation (bad configuration, malformed file, missing reference).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside the domain of the optical model.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public ModelError {
public:
    using ModelError::ModelError;
};

/// The configuration images the pupil (or the object) to infinity.
class SingularConfiguration : public ModelError {
public:
    using ModelError::ModelError;
};

class RangeUnachievable : public ModelError {
public:
    using ModelError::ModelError;
};

class WindowTooNarrow : public ModelError {
public:
    using ModelError::ModelError;
};

class DetectionError : public ModelError {
public:
    using ModelError::ModelError;
};

} // namespace sweepfocus
