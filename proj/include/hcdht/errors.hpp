#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hcdht {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class InvalidKeyword : public Error {
public:
    using Error::Error;
};

class InvalidNodeId : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class AlreadyAtTarget : public Error {
public:
    using Error::Error;
};

class NotInSupersetRegion : public Error {
public:
    using Error::Error;
};

class NotResponsible : public Error {
public:
    using Error::Error;
};

class InvalidRecord : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class BootstrapError : public Error {
public:
    BootstrapError(std::string node, const std::string& what)
        : Error("bootstrap failed for node " + node + ": " + what), node_(std::move(node)) {}

    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

/// Raised by a transport when a message cannot be delivered to a node.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A query could not reach its destination. `path()` holds the text ids of
/// the nodes that handled the message before the failing leg.
class RoutingFailure : public Error {
public:
    RoutingFailure(const std::string& what, std::vector<std::string> path)
        : Error(what), path_(std::move(path)) {}

    const std::vector<std::string>& path() const noexcept { return path_; }

private:
    std::vector<std::string> path_;
};

}  // namespace hcdht
