// halfline.hpp - umbrella header
#pragma once

#include "banded.hpp"
#include "bound.hpp"
#include "boundary.hpp"
#include "bs_operator.hpp"
#include "error.hpp"
#include "fd_oracle.hpp"
#include "free_resolvent.hpp"
#include "harness.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
