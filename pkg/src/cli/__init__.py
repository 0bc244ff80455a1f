# Command line module for Irregular Turbo Lab
