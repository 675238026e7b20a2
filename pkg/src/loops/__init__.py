# Loops package
