#pragma once

namespace haptofv {

// Subcommands: simulate | sweep | convergence | weakcheck | validate-config.
// Exit 0 on success with all hard monitor checks passing, 2 on monitor
// hard-failure, 1 on usage/config errors.
int cli_main(int argc, char** argv);

} // namespace haptofv
