#pragma once

#include <stdexcept>
#include <string>

namespace vercheck {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { config, repository, not_found, parse, analysis };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what)
        , m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what)
        : Error(ErrorKind::config, what)
    {
    }
};

class RepositoryError : public Error {
public:
    explicit RepositoryError(const std::string& what)
        : Error(ErrorKind::repository, what)
    {
    }

protected:
    RepositoryError(ErrorKind kind, const std::string& what)
        : Error(kind, what)
    {
    }
};

/// A file or revision that does not exist in the repository.
class NotFoundError : public RepositoryError {
public:
    explicit NotFoundError(const std::string& what)
        : RepositoryError(ErrorKind::not_found, what)
    {
    }
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what)
        : Error(ErrorKind::parse, what)
    {
    }
};

class AnalysisError : public Error {
public:
    explicit AnalysisError(const std::string& what)
        : Error(ErrorKind::analysis, what)
    {
    }
};

}
