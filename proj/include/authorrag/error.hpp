// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <exception>
#include <stdexcept>
#include <string>

namespace authorrag {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

class IngestionError : public Error {
  public:
    IngestionError(std::string record_id, const std::string& what)
        : Error("ingestion error in record '" + record_id + "': " + what), record_id_(std::move(record_id)) {}

    const std::string& record_id() const noexcept { return record_id_; }

  private:
    std::string record_id_;
};

/// A gold output references a question id that does not exist.
class JoinError : public Error {
  public:
    using Error::Error;
};

class AnnotationError : public Error {
  public:
    using Error::Error;
};

class FeatureError : public Error {
  public:
    using Error::Error;
};

/// Embedding backend failure. Transport-level failures are retryable;
/// dimension mismatches against the cache are not.
class EmbeddingError : public Error {
  public:
    EmbeddingError(const std::string& what, bool retryable) : Error(what), retryable_(retryable) {}

    bool retryable() const noexcept { return retryable_; }

  private:
    bool retryable_;
};

class PromptBudgetError : public Error {
  public:
    PromptBudgetError(std::size_t required, std::size_t available)
        : Error("prompt budget too small: mandatory sections need " + std::to_string(required) +
                " tokens, budget is " + std::to_string(available)),
          required_(required), available_(available) {}

    std::size_t required() const noexcept { return required_; }
    std::size_t available() const noexcept { return available_; }

  private:
    std::size_t required_;
    std::size_t available_;
};

class GenerationError : public Error {
  public:
    using Error::Error;
};

/// Transient transport failure (connection refused, timeout, 5xx, 429).
class TransportError : public GenerationError {
  public:
    using GenerationError::GenerationError;
};

/// The backend rejected the prompt as longer than its context window.
class ContextOverflowError : public GenerationError {
  public:
    using GenerationError::GenerationError;
};

/// Paired t-test on differences with zero variance.
class DegenerateTestError : public Error {
  public:
    using Error::Error;
};

/// Per-instance score lists that do not line up by instance id.
class AlignmentError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Short class name for machine-readable error summaries.
inline std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const PromptBudgetError*>(&e)) return "PromptBudgetError";
    if (dynamic_cast<const ContextOverflowError*>(&e)) return "ContextOverflowError";
    if (dynamic_cast<const TransportError*>(&e)) return "TransportError";
    if (dynamic_cast<const GenerationError*>(&e)) return "GenerationError";
    if (dynamic_cast<const EmbeddingError*>(&e)) return "EmbeddingError";
    if (dynamic_cast<const FeatureError*>(&e)) return "FeatureError";
    if (dynamic_cast<const AnnotationError*>(&e)) return "AnnotationError";
    if (dynamic_cast<const IngestionError*>(&e)) return "IngestionError";
    if (dynamic_cast<const JoinError*>(&e)) return "JoinError";
    if (dynamic_cast<const DegenerateTestError*>(&e)) return "DegenerateTestError";
    if (dynamic_cast<const AlignmentError*>(&e)) return "AlignmentError";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const PreconditionError*>(&e)) return "PreconditionError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "InternalError";
}

} // namespace authorrag
