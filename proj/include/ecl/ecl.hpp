// Copyright (c) ecl contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include "ecl/errors.hpp"
#include "ecl/syntax.hpp"
#include "ecl/sexpr.hpp"
#include "ecl/text.hpp"
#include "ecl/structures.hpp"
#include "ecl/elementary.hpp"
#include "ecl/extension.hpp"
#include "ecl/euf.hpp"
#include "ecl/qe.hpp"
#include "ecl/decide.hpp"
#include "ecl/interp.hpp"
#include "ecl/trep.hpp"
#include "ecl/random.hpp"
#include "ecl/oracle.hpp"
