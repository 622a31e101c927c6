#pragma once

#include <ostream>

namespace graftlab::runner {

// Entry point of the graftlab tool; returns the process exit code.
int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace graftlab::runner
