=== ### ---- +++ ==== ||| ;;; ::: ... ,,, 
