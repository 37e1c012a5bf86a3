#pragma once

#include <stdexcept>
#include <string>

namespace fsosnr {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range scenario configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure inside the simulation pipeline, tagged with the stage that raised it.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace fsosnr
