// Command-line front end; see README.md for the subcommand reference.
#pragma once

namespace ancestree::cli {

int run(int argc, const char* const* argv);

}  // namespace ancestree::cli
