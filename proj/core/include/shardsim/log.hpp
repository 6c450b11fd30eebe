#pragma once

namespace shardsim {

/// Sets the diagnostic level from SHARDSIM_LOG (trace, debug, info, warn,
/// error, critical, off). Defaults to warn; unknown values fall back to info.
void init_logging_from_env();

}  // namespace shardsim
