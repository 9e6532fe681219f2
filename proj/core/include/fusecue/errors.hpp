#pragma once

#include <stdexcept>
#include <string>

namespace fusecue {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidShape : public Error {
public:
    explicit InvalidShape(const std::string& msg) : Error(msg) {}
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

// Malformed or unsupported file contents (tensor files, images, frozen blocks).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

class InvalidCode : public Error {
public:
    explicit InvalidCode(const std::string& msg) : Error(msg) {}
};

// Train-mode use of a frozen fusion block.
class FrozenViolation : public Error {
public:
    explicit FrozenViolation(const std::string& msg) : Error(msg) {}
};

class ManifestError : public Error {
public:
    explicit ManifestError(const std::string& msg) : Error(msg) {}
};

// A video id appears in both train and test of the same dataset.
class LeakageError : public ManifestError {
public:
    explicit LeakageError(const std::string& msg) : ManifestError(msg) {}
};

class EmptyDataset : public Error {
public:
    explicit EmptyDataset(const std::string& msg) : Error(msg) {}
};

// Non-finite training loss; carries the step at which it appeared.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, long step)
        : Error(msg + " (step " + std::to_string(step) + ")"), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

// Metric undefined for the given inputs (e.g. single-class AUC).
class UndefinedMetric : public Error {
public:
    explicit UndefinedMetric(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace fusecue
