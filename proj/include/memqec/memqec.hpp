#pragma once

#include "memqec/bipoly.hpp"
#include "memqec/channel.hpp"
#include "memqec/code.hpp"
#include "memqec/fidelity.hpp"
#include "memqec/format.hpp"
#include "memqec/pauli.hpp"
#include "memqec/recovery.hpp"
#include "memqec/threshold.hpp"
