# Map parsing, reports and the command line
