// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace plba {

// Error categories map 1:1 onto the CLI exit codes (config=1, data=2,
// numeric=3).
enum class ErrorKind { config = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
    throw Error(ErrorKind::config, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
    throw Error(ErrorKind::data, msg);
}
[[noreturn]] inline void throw_numeric(const std::string& msg) {
    throw Error(ErrorKind::numeric, msg);
}

}  // namespace plba
