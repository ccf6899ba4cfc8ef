#pragma once

#include "haar/applications.hpp"
#include "haar/clifford.hpp"
#include "haar/designs.hpp"
#include "haar/ensembles.hpp"
#include "haar/errors.hpp"
#include "haar/linalg.hpp"
#include "haar/matrix_io.hpp"
#include "haar/parallel.hpp"
#include "haar/perm.hpp"
#include "haar/rng.hpp"
#include "haar/shadows.hpp"
#include "haar/subspaces.hpp"
#include "haar/weingarten.hpp"
