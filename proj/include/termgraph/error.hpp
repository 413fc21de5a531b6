#ifndef TERMGRAPH_ERROR_HPP
#define TERMGRAPH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace termgraph {

// Bad or unreadable user input. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A broken internal invariant (e.g. class table counts). Exit code 2.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace termgraph

#endif
