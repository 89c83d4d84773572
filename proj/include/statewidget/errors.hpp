#pragma once

#include <stdexcept>
#include <string>

namespace statewidget {

// Base of every error raised by the library. code() is the short tag used in
// protocol error envelopes and replay reports.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
    virtual const char* code() const noexcept = 0;
};

#define STATEWIDGET_DEFINE_ERROR(Name, Code)                                  \
    class Name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
        const char* code() const noexcept override { return Code; }           \
    };

// A caller broke an operation's precondition (bad enum, unbound interaction...).
STATEWIDGET_DEFINE_ERROR(ContractError, "contract")
STATEWIDGET_DEFINE_ERROR(NotFoundError, "not_found")
// Payload cannot be represented in the export format.
STATEWIDGET_DEFINE_ERROR(PayloadError, "payload")
// A user-supplied override threw; carries the user's message.
STATEWIDGET_DEFINE_ERROR(UdfError, "udf_error")
STATEWIDGET_DEFINE_ERROR(ProtocolError, "protocol")
// Input file parsed but violates its format's invariants.
STATEWIDGET_DEFINE_ERROR(FormatError, "format")
STATEWIDGET_DEFINE_ERROR(BackendError, "backend")
// File could not be opened, read or written.
STATEWIDGET_DEFINE_ERROR(IoError, "io")

#undef STATEWIDGET_DEFINE_ERROR

} // namespace statewidget
