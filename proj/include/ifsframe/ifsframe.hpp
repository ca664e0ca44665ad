#pragma once

#include "ifsframe/beurling.hpp"
#include "ifsframe/catalog.hpp"
#include "ifsframe/error.hpp"
#include "ifsframe/frame.hpp"
#include "ifsframe/hermitian.hpp"
#include "ifsframe/ifs.hpp"
#include "ifsframe/measure.hpp"
#include "ifsframe/reconstruct.hpp"
