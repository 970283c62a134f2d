# Empty init file to make tests a proper Python package
