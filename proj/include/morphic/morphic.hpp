#pragma once

#include "morphic/bigint.hpp"
#include "morphic/constants.hpp"
#include "morphic/decider.hpp"
#include "morphic/error.hpp"
#include "morphic/growth.hpp"
#include "morphic/matrix.hpp"
#include "morphic/nongrowing.hpp"
#include "morphic/oracle.hpp"
#include "morphic/perron.hpp"
#include "morphic/periodic.hpp"
#include "morphic/polynomial.hpp"
#include "morphic/returns.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"
