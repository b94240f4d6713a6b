#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tgram {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2 };

/// Runs `tgram <subcommand> ...`; args[0] is the program name.
///
///   train    treebank -> model file (+ report on stdout)
///   parse    sentences -> one bracketed tree per line, "(())" on failure
///   eval     gold + test trees -> PARSEVAL scores, optional CSVs
///   inspect  model -> T-grams filtered by role/label/depth
///
/// The default directory for headrules.txt / complements.txt comes from
/// the TGRAM_RULES_DIR environment variable; built-in tables otherwise.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tgram
