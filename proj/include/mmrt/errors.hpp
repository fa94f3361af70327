// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mmrt {

/// Root of the project error hierarchy. Every domain failure derives from
/// this so callers can distinguish framework errors from std exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model/back-end adapter failed (unreachable, exhausted, refused).
class AdapterError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public AdapterError {
public:
    using AdapterError::AdapterError;
};

/// A reply could not be parsed into the expected shape.
class FormatError : public Error {
public:
    using Error::Error;
};

/// An encoded image payload could not be decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Typography request cannot be satisfied (empty text, canvas too small).
class StyleError : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class ChannelMismatch : public Error {
public:
    using Error::Error;
};

class KeywordAbsent : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class MissingAsset : public Error {
public:
    using Error::Error;
};

class PairingError : public Error {
public:
    using Error::Error;
};

class UnknownAdapter : public Error {
public:
    using Error::Error;
};

class MissingUpstream : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mmrt
