#pragma once

#include "attack.hpp"
#include "bits.hpp"
#include "commands.hpp"
#include "complexity.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "fixtures.hpp"
#include "keystream_io.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "registers.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "tables.hpp"
#include "taps.hpp"
